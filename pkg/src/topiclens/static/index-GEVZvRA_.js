(function(){const t=document.createElement("link").relList;if(t&&t.supports&&t.supports("modulepreload"))return;for(const s of document.querySelectorAll('link[rel="modulepreload"]'))r(s);new MutationObserver(s=>{for(const c of s)if(c.type==="childList")for(const a of c.addedNodes)a.tagName==="LINK"&&a.rel==="modulepreload"&&r(a)}).observe(document,{childList:!0,subtree:!0});function n(s){const c={};return s.integrity&&(c.integrity=s.integrity),s.referrerPolicy&&(c.referrerPolicy=s.referrerPolicy),s.crossOrigin==="use-credentials"?c.credentials="include":s.crossOrigin==="anonymous"?c.credentials="omit":c.credentials="same-origin",c}function r(s){if(s.ep)return;s.ep=!0;const c=n(s);fetch(s.href,c)}})();class M extends Error{constructor(t,n,r){super(r),this.status=t,this.code=n,this.name="ApiError"}}async function k(e){let t="http_error",n=`${e.status} ${e.statusText}`;try{const r=await e.json();r&&r.error&&(t=r.error.code??t,n=r.error.message??n)}catch{}return new M(e.status,t,n)}class N{constructor(){this.seq=0}next(){return this.seq+=1,this.seq}isCurrent(t){return t===this.seq}}class q{constructor(t=""){this.base=t,this.inflight=new Map}async fetchJson(t,n){const r=await fetch(this.base+t,n);if(!r.ok)throw await k(r);return await r.json()}get(t){const n=this.inflight.get(t);if(n)return n;const r=this.fetchJson(t).finally(()=>{this.inflight.delete(t)});return this.inflight.set(t,r),r}meta(){return this.get("/api/meta")}topics(){return this.get("/api/topics")}topic(t){return this.get(`/api/topics/${t}`)}renameTopic(t,n){return this.fetchJson(`/api/topics/${t}/name`,{method:"PATCH",headers:{"Content-Type":"application/json"},body:JSON.stringify({name:n})})}topicWordcloud(t){return this.get(`/api/topics/${t}/wordcloud`)}map(t){return this.get(`/api/maps/${t}`)}word(t,n=20){return this.get(`/api/words/${t}?n_assoc=${n}`)}document(t){return this.get(`/api/documents/${encodeURIComponent(t)}`)}groups(){return this.get("/api/groups")}group(t){return this.get(`/api/groups/${encodeURIComponent(String(t))}`)}}function i(e,t={},n=[]){const r=document.createElement(e);for(const[s,c]of Object.entries(t))s==="class"?r.className=c:r.setAttribute(s,c);for(const s of n)r.append(s);return r}function $(e,t){var n;(n=e.querySelector(".error-banner"))==null||n.remove(),e.prepend(i("div",{class:"error-banner",role:"alert"},[t]))}function F(e){var t;(t=e.querySelector(".error-banner"))==null||t.remove()}const v=["#1f77b4","#aec7e8","#ff7f0e","#ffbb78","#2ca02c","#98df8a","#d62728","#ff9896","#9467bd","#c5b0d5","#8c564b","#c49c94","#e377c2","#f7b6d2","#7f7f7f","#c7c7c7","#bcbd22","#dbdb8d","#17becf","#9edae5"],D=2e4,E="http://www.w3.org/2000/svg";function G(e,t,n,r){let s=1/0,c=-1/0,a=1/0,m=-1/0;for(const[p,d]of e)s=Math.min(s,p),c=Math.max(c,p),a=Math.min(a,d),m=Math.max(m,d);const u=c-s||1,o=m-a||1;return([p,d])=>[r+(p-s)/u*(t-2*r),n-r-(d-a)/o*(n-2*r)]}function _(e){const t=e.width??640,n=e.height??440,r=e.radii,s=document.createElementNS(E,"svg");s.setAttribute("viewBox",`0 0 ${t} ${n}`),s.setAttribute("class","scatter");const c=document.createElementNS(E,"g");s.append(c);const a={x:0,y:0,scale:1},m=G(e.coordinates,t,n,30),u=e.coordinates.map(m),o=[],p=[];let d=null;const f=()=>{c.setAttribute("transform",`translate(${a.x} ${a.y}) scale(${a.scale})`),u.length>D&&y()},b=l=>{const[h,x]=u[l],g=h*a.scale+a.x,w=x*a.scale+a.y;return g>=-20&&g<=t+20&&w>=-20&&w<=n+20},y=()=>{for(let l=0;l<o.length;l++){const h=!b(l)||d!==null&&d.has(l);o[l].style.display=h?"none":""}};for(let l=0;l<u.length;l++){const[h,x]=u[l],g=document.createElementNS(E,"circle");g.setAttribute("cx",String(h)),g.setAttribute("cy",String(x)),g.setAttribute("r",String(r?r[l]:4)),g.setAttribute("fill",v[e.colorIndex[l]%v.length]),g.setAttribute("class","point"),g.dataset.index=String(l);const w=document.createElementNS(E,"title");w.textContent=e.labels[l],g.append(w),g.addEventListener("click",C=>{var T;C.stopPropagation(),(T=e.onSelect)==null||T.call(e,l)}),c.append(g),o.push(g)}for(const l of e.labelled??[]){const[h,x]=u[l],g=document.createElementNS(E,"text");g.setAttribute("x",String(h)),g.setAttribute("y",String(x-(r?r[l]:4)-3)),g.setAttribute("text-anchor","middle"),g.setAttribute("class","point-label"),g.dataset.index=String(l),g.textContent=e.labels[l],c.append(g),p.push(g)}s.addEventListener("click",()=>{var l;(l=e.onDeselect)==null||l.call(e)}),s.addEventListener("wheel",l=>{l.preventDefault();const h=l.deltaY<0?1.2:1/1.2,x=Math.min(Math.max(a.scale*h,.2),40),g=s.getBoundingClientRect(),w=l.clientX-g.left,C=l.clientY-g.top;a.x=w-(w-a.x)/a.scale*x,a.y=C-(C-a.y)/a.scale*x,a.scale=x,f()});let S=null;return s.addEventListener("pointerdown",l=>{S={startX:l.clientX-a.x,startY:l.clientY-a.y}}),s.addEventListener("pointermove",l=>{S&&(a.x=l.clientX-S.startX,a.y=l.clientY-S.startY,f())}),s.addEventListener("pointerup",()=>{S=null}),{root:s,highlight(l){for(let h=0;h<o.length;h++)o[h].classList.toggle("highlight",l.has(h))},select(l){for(let h=0;h<o.length;h++)o[h].classList.toggle("selected",h===l)},setLabel(l,h){const g=o[l].querySelector("title");g&&(g.textContent=h);for(const w of p)Number(w.dataset.index)===l&&(w.textContent=h)},filter(l){d=l===null?null:new Set(Array.from({length:o.length},(h,x)=>x).filter(h=>!l.has(h)));for(let h=0;h<o.length;h++)o[h].style.display=d!==null&&d.has(h)?"none":""}}}function L(e){const t=Math.max(...e.map(r=>r.value),0),n=e.map((r,s)=>i("div",{class:"bar-row"},[i("span",{class:"bar-label"},[r.label]),i("span",{class:"bar-fill",style:`width:${t>0?100*r.value/t:0}%;background:${v[(r.colorIndex??s)%v.length]}`}),i("span",{class:"bar-value"},[String(r.value)])]));return i("div",{class:"bars"},n)}const A="http://www.w3.org/2000/svg";function O(e,t,n=420,r=160){const s=document.createElementNS(A,"svg");s.setAttribute("viewBox",`0 0 ${n} ${r}`),s.setAttribute("class","timeline");const c=e.filter(o=>!o.empty),a=Math.max(...e.map(o=>o.token_end),1),m=o=>(o.token_start+o.token_end)/2/a*(n-20)+10,u=o=>(1-o)*(r-20)+10;for(let o=0;o<t.length;o++){if(c.length>1){const p=document.createElementNS(A,"polyline");p.setAttribute("points",c.map(d=>`${m(d)},${u(d.distribution[o])}`).join(" ")),p.setAttribute("fill","none"),p.setAttribute("stroke",v[o%v.length]),s.append(p)}for(const p of c){const d=document.createElementNS(A,"circle");d.setAttribute("cx",String(m(p))),d.setAttribute("cy",String(u(p.distribution[o]))),d.setAttribute("r","2.5"),d.setAttribute("fill",v[o%v.length]),d.setAttribute("class","timeline-dot");const f=document.createElementNS(A,"title");f.textContent=`tokens ${p.token_start}-${p.token_end}: `+t.map((b,y)=>`${b}=${p.distribution[y]}`).join(", "),d.append(f),s.append(d)}}return s}function W(e){if(e.empty||e.placements.length===0)return i("p",{class:"empty-state"},["No terms to display."]);const t=e.width??800,n=e.height??500,r=document.createElementNS(A,"svg");return r.setAttribute("viewBox",`0 0 ${t} ${n}`),r.setAttribute("class","wordcloud"),e.placements.forEach((s,c)=>{const a=document.createElementNS(A,"text");a.setAttribute("x",String(s.x)),a.setAttribute("y",String(s.y)),a.setAttribute("font-size",String(s.size)),a.setAttribute("text-anchor","middle"),a.setAttribute("fill",v[c%v.length]),s.rotation&&a.setAttribute("transform",`rotate(90 ${s.x} ${s.y})`),a.textContent=s.term,r.append(a)}),r}function j(e){if(e.length===0)return i("p",{class:"empty-state"},["No term occurrences."]);const t=e[0].count;return i("div",{class:"group-cloud"},e.map(n=>i("span",{class:"cloud-term",title:`${n.term}: ${n.count}`,style:`font-size:${10+18*Math.sqrt(n.count/t)}px`},[n.term])))}function B(e){if(e.snippet.length===0)return i("p",{class:"empty-state"},["Document is empty."]);const t=new TextEncoder().encode(e.snippet),n=new TextDecoder,r=i("p",{class:"snippet"});let s=0;for(const c of e.highlights)c.start>s&&r.append(n.decode(t.subarray(s,c.start))),r.append(i("mark",{"data-term-index":String(c.term_index)},[n.decode(t.subarray(c.start,c.end))])),s=c.end;return s<t.length&&r.append(n.decode(t.subarray(s))),r}async function Y(e,t){e.replaceChildren();let n,r;try{[n,r]=await Promise.all([t.map("documents"),t.topics()])}catch(o){$(e,`Failed to load documents: ${o.message}`);return}const s=r.map(o=>o.name),c=i("section",{class:"detail"},[i("p",{class:"hint"},["Select a document on the map."])]),a=new N,m=_({coordinates:n.coordinates,labels:n.labels,colorIndex:n.dominant,onSelect:o=>{u(o)}});async function u(o){const p=a.next();m.select(o);let d;try{d=await t.document(n.labels[o])}catch(f){$(e,`Failed to load document: ${f.message}`);return}a.isCurrent(p)&&c.replaceChildren(i("h2",{class:"doc-id"},[d.doc_id]),i("p",{class:"doc-meta"},[`group: ${d.group??"none"}, dominant topic: ${s[d.dominant_topic]??d.dominant_topic}`]),i("h3",{},["Topic distribution"]),L(d.topic_distribution.map((f,b)=>({label:s[b]??`Topic ${b}`,value:f,colorIndex:b}))),i("h3",{},["Timeline"]),d.timeline.length>0?O(d.timeline,s):i("p",{class:"empty-state"},["No timeline windows."]),i("h3",{},["Snippet"]),B(d))}e.append(i("div",{class:"page documents-page"},[m.root,c]))}async function R(e,t){e.replaceChildren();let n,r;try{[n,r]=await Promise.all([t.map("groups"),t.topics()])}catch(o){$(e,`Failed to load groups: ${o.message}`);return}const s=r.map(o=>o.name),c=i("section",{class:"detail"},[i("p",{class:"hint"},["Select a group on the map."])]),a=new N,m=_({coordinates:n.coordinates,labels:n.labels,colorIndex:n.dominant,radii:n.labels.map(()=>7),labelled:n.labels.map((o,p)=>p),onSelect:o=>{u(o)}});async function u(o){const p=a.next();m.select(o);let d;try{d=await t.group(o)}catch(f){$(e,`Failed to load group: ${f.message}`);return}a.isCurrent(p)&&c.replaceChildren(i("h2",{class:"group-name"},[d.label]),i("h3",{},["Topic mass"]),L(d.row.map((f,b)=>({label:s[b]??`Topic ${b}`,value:f,colorIndex:b}))),i("h3",{},["Wordcloud"]),j(d.wordcloud))}e.append(i("div",{class:"page groups-page"},[m.root,c]))}function X(e,t,n,r,s){const c=i("input",{class:"rename-input",value:n.name,"aria-label":"topic name"}),a=i("span",{class:"rename-status"}),m=i("button",{class:"rename-button"},["Rename"]);return m.addEventListener("click",async()=>{a.textContent="";try{const u=await t.renameTopic(n.topic_id,c.value);s.textContent=u.name,r.setLabel(n.topic_id,u.name),c.value=u.name,a.textContent="saved",F(e)}catch(u){u instanceof M?a.textContent=u.status===409?`conflict: ${u.message}`:u.message:a.textContent="request failed"}}),i("div",{class:"rename-form"},[c,m,a])}async function z(e,t){e.replaceChildren();let n,r;try{[n,r]=await Promise.all([t.map("topics"),t.topics()])}catch(u){$(e,`Failed to load topics: ${u.message}`);return}const s=i("section",{class:"detail"},[i("p",{class:"hint"},["Select a topic on the map."])]),c=Math.max(...r.map(u=>u.importance),0),a=_({coordinates:n.coordinates,labels:n.labels,colorIndex:n.dominant,radii:r.map(u=>c>0?4+14*Math.sqrt(u.importance/c):6),labelled:r.map(u=>u.topic_id),onSelect:u=>{m(u)}});async function m(u){a.select(u);let o,p;try{[o,p]=await Promise.all([t.topic(u),t.topicWordcloud(u)])}catch(f){$(e,`Failed to load topic: ${f.message}`);return}const d=i("h2",{class:"topic-name"},[o.name]);s.replaceChildren(d,X(e,t,o,a,d),i("p",{class:"topic-stats"},[`importance ${o.importance}, dominant in ${o.dominant_doc_count} documents`]),L(o.top_terms.map(f=>({label:f.term,value:f.weight,colorIndex:o.topic_id}))),W(p))}e.append(i("div",{class:"page topics-page"},[a.root,s]))}async function J(e,t){e.replaceChildren();let n,r;try{[n,r]=await Promise.all([t.map("words"),t.topics()])}catch(p){$(e,`Failed to load words: ${p.message}`);return}const s=r.map(p=>p.name),c=i("section",{class:"detail"},[i("p",{class:"hint"},["Select a word on the map."])]),a=new N,m=_({coordinates:n.coordinates,labels:n.labels,colorIndex:n.dominant,onSelect:p=>{o(p)},onDeselect:()=>{a.next(),m.highlight(new Set),m.select(null),c.replaceChildren(i("p",{class:"hint"},["Select a word on the map."]))}}),u=i("input",{class:"word-search",placeholder:"filter words by prefix","aria-label":"filter words"});u.addEventListener("input",()=>{const p=u.value.toLowerCase();if(!p){m.filter(null);return}const d=new Set;n.labels.forEach((f,b)=>{f.toLowerCase().startsWith(p)&&d.add(b)}),m.filter(d)});async function o(p){const d=a.next();m.select(p);let f;try{f=await t.word(p)}catch(y){$(e,`Failed to load word: ${y.message}`);return}if(!a.isCurrent(d))return;m.highlight(new Set(f.associations.map(y=>y.term_index)));const b=[i("h2",{class:"word-name"},[f.term])];f.zero_norm||f.associations.length===0?b.push(i("p",{class:"empty-state"},["no associations"])):b.push(i("ul",{class:"associations"},f.associations.map(y=>i("li",{"data-term-index":String(y.term_index)},[`${y.term} (${y.similarity})`])))),b.push(i("h3",{},["Topic distribution (word + neighborhood)"]),L(f.distribution.values.map((y,S)=>({label:s[S]??`Topic ${S}`,value:y,colorIndex:S})))),c.replaceChildren(...b)}e.append(i("div",{class:"page words-page"},[u,m.root,c]))}const I=[["Topics",z],["Words",J],["Documents",Y],["Groups",R]];async function V(e,t){e.replaceChildren();let n;try{n=await t.meta()}catch(m){$(e,`API unreachable: ${m.message}`);return}const r=n.has_groups?I:I.filter(([m])=>m!=="Groups"),s=i("main",{class:"content"}),c=i("nav",{class:"nav"}),a=[];for(const[m,u]of r){const o=i("button",{class:"nav-button"},[m]);o.addEventListener("click",()=>{for(const p of a)p.classList.toggle("active",p===o);u(s,t)}),a.push(o),c.append(o)}e.append(c,s),a[0].classList.add("active"),await r[0][1](s,t)}const P=document.getElementById("app");P&&V(P,new q);
